'''Init of hoflow.utils'''
